import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

with open("requirements.txt", "r") as fh:
    requirements = [line.strip() for line in fh if line.strip() and not line.startswith("#")]

setuptools.setup(
    name="microCal",
    version="0.1.0",
    description="Neural posterior estimation for an opinion dynamics agent-based model",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="",
    packages=setuptools.find_packages(exclude=["tests", "tests.*"]),
    package_data={"microCal": ["config/*.json", "config/*.toml"]},
    install_requires=requirements,
    entry_points={"console_scripts": ["microCal=microCal.cli:run"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
)
