import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="lasq",
    version="0.1.0",
    author="Thomas Parry",
    description="Statistical low-light enhancement: luminance adaptation sampling and hierarchically-guided diffusion",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/yrrapt/lasq",
    project_urls={
        "Bug Tracker": "https://github.com/yrrapt/lasq/issues",
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    packages=setuptools.find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "scipy",
        "h5py",
        "matplotlib",
        "PyYAML",
        "opencv-python",
    ],
    extras_require={
        "test": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "lasq=lasq.cli.main:main",
        ],
    },
)
