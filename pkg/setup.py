"""
Setup script for the USV turning-trial toolkit.
"""

from setuptools import find_packages, setup

setup(
    name="usv-turning-trials",
    version="1.0.0",
    description=(
        "Turning-circle trials, EKF localization and IMO maneuverability "
        "checks for small unmanned surface vessels"
    ),
    author="USV Trials Team",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.26.0",
        "scipy>=1.11.0",
        "pandas>=2.1.0",
        "matplotlib>=3.8.0",
        "pydantic>=2.5.0",
        "pydantic-settings>=2.1.0",
        "prometheus-client>=0.19.0",
        "structlog>=23.2.0",
    ],
    extras_require={
        "dev": [
            "pytest>=8.4.1",
            "pytest-cov>=6.2.1",
            "black>=23.0.0",
            "isort>=5.12.0",
            "flake8>=6.0.0",
            "mypy>=1.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "usv=usv_cli.main:main",
        ],
    },
)
