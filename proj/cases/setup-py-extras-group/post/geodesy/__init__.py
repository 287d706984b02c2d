import pyproj
import shapely
