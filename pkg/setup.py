from setuptools import setup, find_packages

setup(
    name="toeplitz-spectra",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "pyyaml",
        "python-json-logger",
        "tqdm",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["toeplitz-spectra=toeplitz_spectra.cli:run"]},
    python_requires=">=3.10",
)
