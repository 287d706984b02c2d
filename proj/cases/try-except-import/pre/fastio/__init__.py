try:
    import ujson as json
except ImportError:
    import json

import click


def dump(obj):
    return json.dumps(obj)
