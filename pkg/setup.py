from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="invariant-labels",
    version="0.1.0",
    description="Kernel-based approximately invariant label functions for 2D symplectic maps.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
        "Typing :: Typed",
    ],
    packages=find_packages(include=['invlabel', 'invlabel.*']),
    include_package_data=True,
    python_requires=">=3.9",
    install_requires=[
        "pydantic >= 2.7.0",
        "numpy >= 1.22",
        "scipy >= 1.9",
    ],
    extras_require={
        "dev": [
            "pytest",
            "pytest-asyncio",
            "ruff",
        ],
    },
    entry_points={
        "console_scripts": [
            "invlabel = invlabel.cli:main",
        ],
    },
)
