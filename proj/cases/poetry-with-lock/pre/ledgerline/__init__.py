import attr
import requests
