import io
import sys
from pathlib import Path

import click
from loguru import logger

from thzlab.config import STAGES, BandSelection, PipelineConfig, Stage
from thzlab.directories import OutputLayout
from thzlab.pipeline import run_pipeline


def setup_logging(log_dir: Path, debug: bool = False) -> None:
    if isinstance(sys.stdout, io.TextIOWrapper):
        sys.stdout.reconfigure(encoding="utf-8")
    if isinstance(sys.stderr, io.TextIOWrapper):
        sys.stderr.reconfigure(encoding="utf-8")
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if debug else "INFO")
    logger.add(
        log_dir / "{time:YYYY-MM-DD}.log",
        rotation="1 day",
        colorize=False,
        format=(
            "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | "
            "{name}:{function}:{line} - {message}"
        ),
    )


@click.group()
@click.option(
    "--config",
    "scenario_path",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="Scenario JSON; defaults to the bundled laboratory.",
)
@click.option(
    "--out",
    type=click.Path(path_type=Path, file_okay=False),
    default=Path("thzlab-out"),
    envvar="THZLAB_OUT",
    show_default=True,
)
@click.option("--seed", type=click.IntRange(min=0), default=None, envvar="THZLAB_SEED")
@click.option("--band", type=click.Choice(["140", "220", "both"]), default="both", show_default=True)
@click.option("--reference", type=click.Path(path_type=Path, dir_okay=False), default=None)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--svg", is_flag=True, help="Also render plots as SVG.")
@click.option("--cir-csv", is_flag=True, help="Also write CIRs as CSV.")
@click.option("--debug", is_flag=True)
@click.pass_context
def cli(
    ctx: click.Context,
    scenario_path: Path | None,
    out: Path,
    seed: int | None,
    band: BandSelection,
    reference: Path | None,
    workers: int | None,
    svg: bool,
    cir_csv: bool,
    debug: bool,
):
    config = PipelineConfig(
        output=OutputLayout(root=out),
        bands=band,
        seed=seed,
        reference_path=reference,
        workers=workers,
        svg=svg,
        cir_csv=cir_csv,
        debug=debug,
    )
    if scenario_path is not None:
        config.scenario_path = scenario_path
    setup_logging(config.output.logs, debug)
    if debug:
        logger.warning("Debug mode enabled")
    ctx.obj = config


def _run(config: PipelineConfig, stage_from: Stage, stage_to: Stage) -> int:
    config.stage_from = stage_from
    config.stage_to = stage_to
    result = run_pipeline(config)
    if result.exit_status == 0:
        logger.info(f"Done: {config.output.root}")
    return result.exit_status


@cli.command(help="Synthesize the direction-scan CIR campaign.")
@click.pass_obj
def synth(config: PipelineConfig) -> int:
    return _run(config, "synth", "synth")


@cli.command(help="Calibrate, drift-correct, extract and cluster MPCs.")
@click.pass_obj
def postproc(config: PipelineConfig) -> int:
    return _run(config, "postproc", "postproc")


@cli.command(help="Compute per-position and ensemble channel statistics.")
@click.pass_obj
def characterize(config: PipelineConfig) -> int:
    return _run(config, "characterize", "characterize")


@cli.command(help="Compare ensemble statistics against the reference table.")
@click.pass_obj
def report(config: PipelineConfig) -> int:
    return _run(config, "report", "report")


@cli.command(name="all", help="Run every stage from --stage-from through report.")
@click.option("--stage-from", type=click.Choice(STAGES), default="synth", show_default=True)
@click.pass_obj
def run_all(config: PipelineConfig, stage_from: Stage) -> int:
    return _run(config, stage_from, "report")


def main(args: list[str] | None = None) -> None:
    try:
        status = cli.main(args=args, prog_name="thzlab", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        sys.exit(1)
    except click.Abort:
        sys.exit(1)
    sys.exit(status if isinstance(status, int) else 0)


if __name__ == "__main__":
    main()
