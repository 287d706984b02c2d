from setuptools import setup

setup(
    name="mdtools",
    install_requires=["markdown", "PyYAML>=6.0", "nose"],
    extras_require={
        "test": ["nose", "coverage"],
    },
)
