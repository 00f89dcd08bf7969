from setuptools import find_packages, setup

with open("./requirements.txt") as f:
    REQUIREMENTS = f.readlines()

setup(
    name="itflow",
    version="0.1.0",
    zip_safe=False,
    include_package_data=True,
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={
        "itflow": [
            "conf/*",
        ]
    },
    long_description=open("./README.md").read(),
    long_description_content_type="text/markdown",
    python_requires=">=3.8",
    install_requires=REQUIREMENTS,
    entry_points={
        "console_scripts": [
            "itflow=itflow.harness.cli:main",
        ],
    },
    extras_require={
        "tests": [
            "pytest>=4.4.0",
            "pytest-cov>=2.6.1",
        ],
        "docs": [
            "numpydoc",
            "recommonmark",
            "sphinx>=3.4.0",
            "sphinxcontrib-napoleon",
            "sphinx_rtd_theme",
        ],
    },
)
