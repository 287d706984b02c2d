import click
from rich.table import Table
