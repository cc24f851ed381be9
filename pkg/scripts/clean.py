from pathlib import Path

import click

PATTERNS = (
    "**/__pycache__",
    "**/.pytest_cache",
    "**/.ruff_cache",
    "thzlab-out",
)


def remove(path: Path) -> int:
    if path.is_dir():
        removed = sum(remove(child) for child in path.iterdir())
        path.rmdir()
        return removed
    path.unlink()
    return 1


def clean(root: Path, *patterns: str, dry_run: bool = False) -> int:
    removed = 0
    for pattern in patterns:
        for path in sorted(root.glob(pattern)):
            if not path.exists() or "examples" in path.relative_to(root).parts:
                continue
            click.echo(f"{'would remove' if dry_run else 'removing'} {path.relative_to(root)}")
            if not dry_run:
                removed += remove(path)
    return removed


@click.command()
@click.option("--out", "outputs", multiple=True, type=click.Path(path_type=Path), help="Extra output directories.")
@click.option("--dry-run", is_flag=True)
def main(outputs: tuple[Path, ...], dry_run: bool):
    cwd = Path.cwd()
    patterns = PATTERNS + tuple(str(path) for path in outputs)
    removed = clean(cwd, *patterns, dry_run=dry_run)
    if not dry_run:
        click.echo(f"Removed {removed} files")


if __name__ == "__main__":
    main()
