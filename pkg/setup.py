from setuptools import setup

__version__ = "0.1.0"

install_requires = [
    "numpy>=1.11",
    "scipy>=1.0",
    "pandas>=1.0",
    "tqdm>=4",
    "PyYAML>=5.1",
]


setup(
    name="nvcavity",
    version=__version__,
    description="Microwave cavity design for NV spin ensembles",
    long_description="",
    install_requires=install_requires,
    packages=[
        "nvcavity",
        "nvcavity.solvers",
        "nvcavity.utils",
        "nvcavity.utils.callbacks",
        "nvcavity.utils.table_data",
    ],
    zip_safe=False,
    python_requires=">=3.7.0",
    package_data={
        "nvcavity": ["data/*.txt", "data/*.csv", "data/specs/*.yaml"],
    },
    entry_points={"console_scripts": ["nvcavity = nvcavity.cli:main"]},
)
