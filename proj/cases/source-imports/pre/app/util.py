import six


def identity(x):
    return x
