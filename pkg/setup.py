"""
Setup script for VSP block-sparse recovery
"""
from setuptools import setup, find_packages
from pathlib import Path

# Read README
readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text(encoding="utf-8") if readme_file.exists() else ""

# Read requirements
requirements_file = Path(__file__).parent / "requirements.txt"
requirements = []
if requirements_file.exists():
    requirements = [
        line.split("#")[0].strip()
        for line in requirements_file.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]

setup(
    name="vsp-recovery",
    version="1.0.0",
    description="Variance state propagation for block-sparse compressed sensing",
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="VSP Team",
    author_email="",
    packages=find_packages(include=["src", "src.*"]),
    py_modules=["main"],
    include_package_data=True,
    package_data={"src.bench": ["templates/*.j2"]},
    install_requires=requirements,
    python_requires=">=3.10",
    entry_points={
        "console_scripts": [
            "vsp=main:cli",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    keywords="compressed-sensing block-sparse bayesian message-passing mrf",
)
