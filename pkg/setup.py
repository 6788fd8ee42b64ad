from os import path
from setuptools import setup, find_packages
from codecs import open

NAME = "sugra47"

with open(
    path.join(path.abspath(path.dirname(__file__)), "README.md"), encoding="utf-8"
) as f:
    long_description = f.read()

setup(
    name=NAME,
    version="0.3.0",
    license="LGPLv3",
    description="Checks (4,7)-decomposable backgrounds of eleven-dimensional supergravity on homogeneous spaces",
    long_description=long_description,
    long_description_content_type="text/markdown",
    # See https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        "License :: OSI Approved :: GNU Lesser General Public License v3 (LGPLv3)",
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Education",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
        "Programming Language :: Python :: 3 :: Only",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    keywords="supergravity g2 three-forms homogeneous-spaces exterior-algebra",
    packages=find_packages(include=[NAME]),
    python_requires=">= 3.9",
    install_requires=[
        "click ~= 8.1.7",
        "jsonschema ~= 4.21.0",
        "ruamel.yaml ~= 0.18.6",
        "sympy ~= 1.12",
        "numpy ~= 1.26",
        "scipy ~= 1.11",
    ],
    extras_require={"test": ["pytest ~= 7.4"], "scripts": ["pandas ~= 2.1", "tqdm ~= 4.66"]},
    zip_safe=True,
    entry_points={"console_scripts": [f"{NAME}={NAME}.main:main"]},
    package_data={NAME: ["scenario-schema.json"]},
)
