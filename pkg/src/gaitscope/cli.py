"""Command-line interface.

Exit codes: 0 on success, 2 for annotation parse/schema errors, 3 for
computational errors (degenerate geometry, classification failures).
"""

from __future__ import annotations

import pathlib
import sys

import click

from . import fixtures, pipeline
from .annotations import parse_annotations
from .classify import SCALING_METHODS
from .errors import AnnotationError, GaitscopeError

EXIT_PARSE_ERROR = 2
EXIT_COMPUTE_ERROR = 3


def _load_document(path: str):
    try:
        return parse_annotations(pathlib.Path(path).read_bytes())
    except AnnotationError as exc:
        click.secho(f"annotation error: {exc}", fg="red", err=True)
        sys.exit(EXIT_PARSE_ERROR)


def _fail_compute(exc: GaitscopeError):
    click.secho(f"error: {exc}", fg="red", err=True)
    sys.exit(EXIT_COMPUTE_ERROR)


@click.group()
def main():
    """Perspective-corrected gait features and fall prediction.

    Exit codes: 0 success, 2 annotation parse/schema errors,
    3 computational errors.
    """


@main.command()
@click.argument("annotations", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(file_okay=False),
              help="Output directory for rectified track CSVs.")
def rectify(annotations, out):
    """Emit rectified footfall and head tracks as CSV."""
    doc = _load_document(annotations)
    try:
        footfalls, heads = pipeline.rectified_tracks(doc)
    except GaitscopeError as exc:
        _fail_compute(exc)
    out_dir = pathlib.Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "footfalls.csv").write_text(footfalls)
    (out_dir / "head_tracks.csv").write_text(heads)
    click.echo(f"wrote {out_dir / 'footfalls.csv'}")
    click.echo(f"wrote {out_dir / 'head_tracks.csv'}")


@main.command()
@click.argument("annotations", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Output feature CSV path.")
def extract(annotations, out):
    """Compute per-person gait features from raw landmark annotations."""
    doc = _load_document(annotations)
    try:
        result = pipeline.run_extract(doc)
    except GaitscopeError as exc:
        _fail_compute(exc)
    pathlib.Path(out).write_text(
        fixtures.feature_table_to_csv(result.table)
    )
    if not result.table.rows:
        click.secho("warning: no features extracted", fg="yellow", err=True)
    for person_id, reason in result.skipped:
        click.secho(f"skipped person {person_id}: {reason}", fg="yellow",
                    err=True)
    click.echo(f"wrote {len(result.table.rows)} feature rows to {out}")


@main.command()
@click.argument("features", required=False,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--fixture", "use_fixture", is_flag=True,
              help="Use the bundled 14-person study table.")
@click.option("--method", type=click.Choice(["svm", "knn"]), default="svm",
              show_default=True)
@click.option("--scaling", type=click.Choice(SCALING_METHODS), default=None,
              help="Feature scaling; defaults to the method's best-matching "
                   "variant (svm: none, knn: zscore).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False),
              default=None, help="Report directory for CSV and ROC SVG.")
def classify(features, use_fixture, method, scaling, out_dir):
    """Leave-one-out fall prediction from a feature table."""
    if use_fixture == bool(features):
        raise click.UsageError("provide a features CSV or --fixture")
    if use_fixture:
        table = fixtures.load_feature_fixture()
    else:
        try:
            table = fixtures.feature_table_from_csv(
                pathlib.Path(features).read_text()
            )
        except AnnotationError as exc:
            click.secho(f"feature CSV error: {exc}", fg="red", err=True)
            sys.exit(EXIT_PARSE_ERROR)
    try:
        report = pipeline.run_classify(table, method, scaling)
    except GaitscopeError as exc:
        _fail_compute(exc)

    correct = round(report.accuracy * len(report.per_person))
    click.echo(f"method: {method}  scaling: {report.scaling}")
    click.echo(
        f"accuracy: {correct}/{len(report.per_person)} "
        f"({report.accuracy:.1%})"
    )
    mis = ", ".join(str(i) for i in report.misclassified_ids) or "none"
    click.echo(f"misclassified: {mis}")
    click.echo(f"AUC: {report.auc:.3f}")

    if out_dir is not None:
        out = pathlib.Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "predictions.csv").write_text(
            pipeline.predictions_csv(report)
        )
        (out / "roc.svg").write_text(pipeline.roc_svg(report))
        click.echo(f"wrote {out / 'predictions.csv'}")
        click.echo(f"wrote {out / 'roc.svg'}")


@main.command()
def report():
    """Summary of the bundled study table and both classifiers."""
    table = fixtures.load_feature_fixture()
    click.echo("person  L (px)  H (%)  outcome  strides")
    for row in table.rows:
        click.echo(
            f"{row.person_id:>6}  {row.stride_length:>6.1f}  "
            f"{row.head_range:>5.1f}  {row.outcome.value:<7}  "
            f"{row.stride_count:>7}"
        )
    for method in ("svm", "knn"):
        rep = pipeline.run_classify(table, method)
        correct = round(rep.accuracy * len(rep.per_person))
        mis = ", ".join(str(i) for i in rep.misclassified_ids) or "none"
        click.echo(
            f"{method} ({rep.scaling}): {correct}/{len(rep.per_person)} "
            f"correct, misclassified [{mis}], AUC {rep.auc:.3f}"
        )


if __name__ == "__main__":
    main()
