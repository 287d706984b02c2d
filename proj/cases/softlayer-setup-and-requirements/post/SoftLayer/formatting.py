import click
from rich.table import Table


def table(rows):
    t = Table()
    for row in rows:
        t.add_row(*row)
    return t
