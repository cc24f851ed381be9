import sys
import tomllib
from pathlib import Path
from typing import TypedDict

import click

HEADER = "# Do not edit this file, it is automatically generated by scripts/generate_version.py\n"


class Project(TypedDict):
    name: str
    version: str


def get_project(project: Path) -> Project:
    toml = project / "pyproject.toml"
    if not toml.exists():
        raise FileNotFoundError(f"Could not find {toml}")
    data = tomllib.loads(toml.read_text(encoding="utf-8"))
    return Project(name=data["project"]["name"], version=data["project"]["version"])


def render_version(project: Project) -> str:
    return f'{HEADER}VERSION = "{project["version"]}"\n'


def version_path(package: Path, project: Project) -> Path:
    return package / "src" / project["name"] / "version.py"


@click.command()
@click.option("--check", is_flag=True, help="Fail when a version.py is out of date instead of writing it.")
def main(check: bool):
    stale = []
    for package in sorted(Path("packages").glob("*")):
        if not (package / "pyproject.toml").exists():
            continue
        project = get_project(package)
        path = version_path(package, project)
        expected = render_version(project)
        current = path.read_text(encoding="utf-8") if path.exists() else None
        if current == expected:
            continue
        if check:
            stale.append(path)
            continue
        path.write_text(expected, encoding="utf-8")
        click.echo(f"[{project['name']}] {project['version']}")
    if stale:
        click.echo("Out of date: " + ", ".join(str(path) for path in stale), err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
