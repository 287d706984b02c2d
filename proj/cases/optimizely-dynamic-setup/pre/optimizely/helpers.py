import jsonschema
import requests
