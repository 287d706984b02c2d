try:
    pass
except ImportError:
    import json

import click


def dump(obj):
    return json.dumps(obj)
