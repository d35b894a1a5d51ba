from setuptools import setup, find_packages
import os

# read the contents of your README file
this_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(this_directory, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name="lrd_entropy",
    version="0.1.0",
    packages=find_packages(),
    package_data={"lrd_entropy": ["presets/*.json"]},
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.10",
    ],
    extras_require={
        "test": ["mpmath>=1.3"],
    },
    entry_points={
        "console_scripts": [
            "lrd-entropy=lrd_entropy.lrd_entropy:main",
        ],
    },
    description="CLI tool for kernel estimation of the quadratic functional and Renyi entropy "
    "of long-memory linear processes with heavy-tailed innovations",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Operating System :: OS Independent",
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    keywords="stable distributions, long memory, linear process, kernel estimation, renyi entropy, monte carlo",
)
