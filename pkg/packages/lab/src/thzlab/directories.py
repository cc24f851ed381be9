from __future__ import annotations

import pathlib
from dataclasses import dataclass

from thzlab.helper import safe_path_join


@dataclass(frozen=True, slots=True)
class OutputLayout:
    root: pathlib.Path

    @classmethod
    def default(cls) -> OutputLayout:
        return OutputLayout(root=pathlib.Path.cwd() / "thzlab-out")

    def mkdir(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)

    def get(self, *names: str) -> pathlib.Path:
        path = safe_path_join(self.root, *names)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def cir(self, band: str) -> pathlib.Path:
        return self.get("cir", f"{band}.thzc")

    def cir_csv(self, band: str) -> pathlib.Path:
        return self.get("cir", f"{band}.csv")

    def calibration(self, band: str) -> pathlib.Path:
        return self.get("cir", f"{band}.calibration.thzc")

    def truth(self, band: str) -> pathlib.Path:
        return self.get("truth", f"{band}.json")

    def postproc(self, band: str, name: str) -> pathlib.Path:
        return self.get("postproc", band, name)

    def stats(self, band: str, name: str) -> pathlib.Path:
        return self.get("stats", band, name)

    def report(self, name: str) -> pathlib.Path:
        return self.get("report", name)

    def plots(self, band: str) -> pathlib.Path:
        path = safe_path_join(self.root, "plots", band)
        path.mkdir(parents=True, exist_ok=True)
        return path

    @property
    def logs(self) -> pathlib.Path:
        return self.root / "logs"

    @property
    def manifest(self) -> pathlib.Path:
        return self.root / "manifest.json"
