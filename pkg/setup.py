from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8", errors="ignore") as fh:
    long_description = fh.read()

setup(
    name="xsb_ladder",
    version="0.1.0",
    author="wxyri",
    author_email="your.email@example.com",
    description="X^{s,b} 自举证明脚本的精确验证工具",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    python_requires=">=3.10",
    install_requires=[
        "lark>=1.1",
        "mcp<2",
        "numpy>=1.22",
        "pydantic>=2",
        "sympy>=1.10",
    ],
    extras_require={
        "tests": ["pytest"],
    },
    entry_points={
        "console_scripts": [
            "xsb-ladder=xsb_ladder.cli:main",
        ],
    },
    include_package_data=True,
    package_data={"xsb_ladder": ["data/*.ladder"]},
)
