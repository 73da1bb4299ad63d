"""CMake-driven build of the aesrank extension module.

The compiled core lives in a CMake project; this shim configures it with
AESRANK_WHEEL=ON (library only, no CLI, no test suite) and drops the
pybind11 module where setuptools expects the extension to appear.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_fullpath = Path.cwd() / self.get_ext_fullpath(ext.name)
        package_dir = ext_fullpath.parent.resolve()
        cfg = "Debug" if int(os.environ.get("DEBUG", "0")) else "Release"

        cmake_args = [
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={package_dir}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            f"-DCMAKE_BUILD_TYPE={cfg}",
            "-DAESRANK_WHEEL=ON",
            "-DAESRANK_BUILD_CLI=OFF",
            "-DAESRANK_BUILD_TESTS=OFF",
            "-DAESRANK_BUILD_PYTHON=ON",
        ]
        if "CMAKE_ARGS" in os.environ:
            cmake_args += [a for a in os.environ["CMAKE_ARGS"].split(" ") if a]

        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)
        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", "-j", str(os.cpu_count() or 1)],
            cwd=build_temp,
            check=True,
        )


setup(
    packages=["aesrank"],
    package_dir={"aesrank": "python/aesrank"},
    ext_modules=[CMakeExtension("aesrank._core")],
    cmdclass={"build_ext": CMakeBuild},
)
