import os
import six, requests
from six.moves import urllib


def fetch(url):
    return requests.get(url).text
