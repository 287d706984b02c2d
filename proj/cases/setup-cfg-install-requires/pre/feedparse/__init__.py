import lxml
import chardet
