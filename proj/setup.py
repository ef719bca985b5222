"""CMake-driven extension build: configures the project with the packaging
flag on, builds the _core pybind11 module, and drops it next to the package
sources (editable installs) or into the wheel staging tree."""

import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        ext_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        staging = Path(self.build_temp).resolve() / "staging"
        build_dir.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                "-DSKBUILD=ON",
                f"-DCMAKE_BUILD_TYPE={cfg}",
                f"-DPython3_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_core", f"-j{os.cpu_count() or 2}"],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--install", ".", "--prefix", str(staging)],
            cwd=build_dir,
            check=True,
        )

        ext_path.parent.mkdir(parents=True, exist_ok=True)
        built = sorted((staging / "delcon").glob("_core*"))
        if not built:
            raise RuntimeError("CMake install produced no _core module")
        shutil.copy2(built[0], ext_path)


setup(
    ext_modules=[CMakeExtension("delcon._core")],
    cmdclass={"build_ext": CMakeBuild},
)
