from setuptools import setup

setup(
    name="mdtools",
    install_requires=["markdown"],
    extras_require={
        "test": ["coverage"],
    },
)
