"""Click commands."""

import os
from glob import glob
from subprocess import call

import click

from .app import create_app
from .bench import run_benchmarks
from .common.logging import (
    bench_table,
    console,
    error_console,
    format_seconds,
    prioritized_table,
    solution_panel,
    stats_table,
)
from .common.recording import read_jsonl, write_csv, write_json, write_jsonl
from .exceptions import ConfigurationError, EmptyDataset, UnknownOpError
from .guidance.factory import model_path
from .guidance.features import Featurizer
from .learning.datagen import DatasetExample, generate_dataset
from .learning.fit_nl import fit_nl_models, read_corpus
from .learning.losses import LossKind, Weighting
from .learning.train import LOG_HEADER, TrainConfig, Trainer
from .search.engine import Outcome, ValueSearch
from .search.task import SearchConfig, parse_task

HERE = os.path.abspath(os.path.dirname(__file__))
PROJECT_ROOT = os.path.join(HERE, os.pardir)
TEST_PATH = os.path.join(PROJECT_ROOT, "tests")

EXIT_SOLVED = 0
EXIT_ERROR = 1
EXIT_TIMEOUT = 2
EXIT_EXHAUSTED = 3


def fail(error: Exception):
    """Print a configuration or I/O error and exit with status 1."""
    if isinstance(error, ConfigurationError):
        error_console.print(error.get_response_content(), markup=False, highlight=False)
    else:
        error_console.print(f"Error: {error}", markup=False, highlight=False)
    raise SystemExit(EXIT_ERROR)


@click.group()
@click.pass_context
def cli(ctx):
    """Synthesize tensor manipulation programs from examples."""
    if ctx.obj is None:
        try:
            ctx.obj = create_app()
        except ConfigurationError as e:
            fail(e)


def search_options(func):
    """Options shared by solve and bench."""
    options = [
        click.option("--timeout", type=float, default=None, help="Time budget per task in seconds"),
        click.option("--max-weight", type=int, default=None, help="Largest expression weight to enumerate"),
        click.option("--no-filters", is_flag=True, help="Execute every candidate, ignoring operation filters"),
        click.option("--equal-weights", is_flag=True, help="Give every operation and leaf weight 1"),
        click.option("--weights", "weights_path", type=click.Path(dir_okay=False), help="Weight table file"),
        click.option("--models", "models_dir", type=click.Path(file_okay=False), help="Guidance models directory"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@cli.command()
@click.option("--task", "task_path", required=True, type=click.Path(dir_okay=False), help="Task file")
@search_options
@click.option("--max-solutions", type=int, default=None, help="Number of distinct solutions to print")
@click.option("--no-tensor-model", is_flag=True, help="Do not prioritize operations from tensor features")
@click.option("--no-nl-model", is_flag=True, help="Do not prioritize operations from the description")
@click.option(
    "--render",
    type=click.Choice(["pythonic", "functional", "both"]),
    default="both",
    show_default=True,
    help="Program text style",
)
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@click.option("--stats", "show_stats", is_flag=True, help="Print search statistics")
@click.pass_obj
def solve(
    app,
    task_path,
    timeout,
    max_weight,
    no_filters,
    equal_weights,
    weights_path,
    models_dir,
    max_solutions,
    no_tensor_model,
    no_nl_model,
    render,
    seed,
    show_stats,
):
    """Find programs consistent with a task file."""
    try:
        settings = SearchConfig.from_config(
            app.config,
            timeout=timeout,
            max_weight=max_weight,
            max_solutions=max_solutions,
            disable_filters=no_filters,
            equal_weights=equal_weights,
            disable_tensor_model=no_tensor_model,
            disable_nl_model=no_nl_model,
            rng_seed=seed,
        )
        task = parse_task(task_path, settings)
        base = app.weight_table(weights_path)
        models = app.guidance(models_dir, not no_tensor_model, not no_nl_model)
        weights, predictions = app.prioritized_weights(task, base, models)
    except (ConfigurationError, UnknownOpError, ValueError, OSError) as e:
        fail(e)

    if predictions:
        console.print(prioritized_table(predictions))
    value_search = ValueSearch(task, app.registry, weights)
    count = 0
    for solution in value_search.solutions():
        count += 1
        console.print(solution_panel(solution, count, render))
        if render in ("pythonic", "both"):
            click.echo(solution.pythonic)
        if render in ("functional", "both"):
            click.echo(solution.functional)
    if show_stats:
        console.print(stats_table(value_search.stats))

    if count:
        click.echo(f"Solved: {count} solution(s) in {format_seconds(value_search.stats.elapsed)} s")
        raise SystemExit(EXIT_SOLVED)
    if value_search.outcome == Outcome.TIMEOUT:
        click.echo(f"Timeout: no solution within {format_seconds(settings.timeout)} s")
        raise SystemExit(EXIT_TIMEOUT)
    click.echo(f"Exhausted: no solution up to weight {value_search.stats.max_weight_reached}")
    raise SystemExit(EXIT_EXHAUSTED)


@cli.command()
@click.option("--suite", "suite_dir", type=click.Path(file_okay=False), default=None, help="Directory of task files")
@search_options
@click.option("--no-models", is_flag=True, help="Do not use any guidance model")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Write the report as CSV")
@click.pass_obj
def bench(app, suite_dir, timeout, max_weight, no_filters, equal_weights, weights_path, models_dir, no_models, csv_path):
    """Run every task of a benchmark suite."""
    try:
        settings = SearchConfig.from_config(
            app.config,
            timeout=timeout,
            max_weight=max_weight,
            disable_filters=no_filters,
            equal_weights=equal_weights,
            disable_tensor_model=no_models,
            disable_nl_model=no_models,
        )
        base = app.weight_table(weights_path)
        models = [] if no_models else app.guidance(models_dir)
    except (ConfigurationError, ValueError, OSError) as e:
        fail(e)

    report = run_benchmarks(app, suite_dir or app.config["BENCHMARKS_DIR"], settings, base, models)
    console.print(bench_table(report))
    summary = report.summary
    click.echo(
        f"Solved {summary['solved']}/{summary['tasks']}, median {format_seconds(summary['median_time'])} s, "
        f"total {format_seconds(summary['total_time'])} s, {report.executions} executions"
    )
    if csv_path:
        report.write_csv(csv_path)


@cli.command()
@click.option("--output", "output_path", required=True, type=click.Path(dir_okay=False), help="Dataset JSON Lines file")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--runs", type=int, default=10, show_default=True, help="Number of searches")
@click.option(
    "--per-run-duration",
    type=float,
    default=10.0,
    show_default=True,
    help="Seconds per search; output repeats for a seed only when --per-run-values binds first",
)
@click.option("--per-run-cap", type=int, default=2000, show_default=True, help="Values sampled per search")
@click.option("--per-run-values", type=int, default=5000, show_default=True, help="Values enumerated per search")
@click.option("--max-weight", type=int, default=200, show_default=True)
@click.pass_obj
def datagen(app, output_path, seed, runs, per_run_duration, per_run_cap, per_run_values, max_weight):
    """Generate a synthetic dataset for the tensor model."""
    dataset = generate_dataset(
        app.registry,
        seed=seed,
        runs=runs,
        per_run_duration=per_run_duration,
        per_run_cap=per_run_cap,
        per_run_values=per_run_values,
        max_weight=max_weight,
    )
    try:
        count = write_jsonl(output_path, (example.to_record() for example in dataset))
    except OSError as e:
        fail(e)
    click.echo(f"Wrote {count} examples to {output_path}")


@cli.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--loss", type=click.Choice([kind.value for kind in LossKind]), default="ce", show_default=True)
@click.option(
    "--weighting", type=click.Choice([scheme.value for scheme in Weighting]), default="none", show_default=True
)
@click.option("--epochs", type=int, default=10, show_default=True)
@click.option("--batch-size", type=int, default=128, show_default=True)
@click.option("--learning-rate", type=float, default=1.0, show_default=True)
@click.option("--hidden-units", type=int, default=0, show_default=True, help="0 trains a linear model")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "output_path", type=click.Path(dir_okay=False), default=None, help="Model file")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None, help="CSV loss log")
@click.pass_obj
def train(
    app, dataset_path, loss, weighting, epochs, batch_size, learning_rate, hidden_units, seed, output_path, log_path
):
    """Train the tensor model on a generated dataset."""
    tensor_config = app.guidance_config.of_kind("tensor")
    output_path = output_path or model_path(app.config["MODELS_DIR"], tensor_config)
    log_path = log_path or os.path.splitext(output_path)[0] + "_log.csv"
    config = TrainConfig(
        loss=LossKind(loss),
        weighting=Weighting(weighting),
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        hidden_units=hidden_units,
        rng_seed=seed,
    )
    try:
        dataset = [DatasetExample.from_record(record) for record in read_jsonl(dataset_path)]
        trainer = Trainer(config, app.registry.names(), Featurizer(app.guidance_config.buckets))
        params = trainer.fit(dataset)
        write_json(output_path, params.to_dict())
        write_csv(log_path, LOG_HEADER, ([epoch, repr(t), repr(e)] for epoch, t, e in trainer.history))
    except (ConfigurationError, EmptyDataset, OSError) as e:
        fail(e)
    first_eval = trainer.history[0][2]
    last_eval = trainer.history[-1][2]
    click.echo(f"Trained on {len(dataset)} examples: eval loss {first_eval:.6f} -> {last_eval:.6f}")
    click.echo(f"Wrote {output_path} and {log_path}")


@cli.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--models", "models_dir", type=click.Path(file_okay=False), default=None, help="Output directory")
@click.pass_obj
def fitnl(app, corpus_path, models_dir):
    """Fit the TF-IDF and naive Bayes models."""
    models_dir = models_dir or app.config["MODELS_DIR"]
    tfidf_config = app.guidance_config.of_kind("tfidf")
    nb_config = app.guidance_config.of_kind("naive_bayes")
    try:
        corpus = read_corpus(corpus_path, app.registry.names()) if corpus_path else None
        tfidf, naive_bayes = fit_nl_models(
            app.docstrings, corpus, ops=app.registry.names(), tfidf_config=tfidf_config, nb_config=nb_config
        )
        paths = []
        for model in (tfidf, naive_bayes):
            path = model_path(models_dir, model.config)
            write_json(path, model.to_dict())
            paths.append(path)
    except (ConfigurationError, UnknownOpError, OSError) as e:
        fail(e)
    click.echo(f"Fitted {len(tfidf.vocabulary)} terms; wrote {' and '.join(paths)}")


@cli.command()
@click.option(
    "-c/-C",
    "--coverage/--no-coverage",
    default=True,
    is_flag=True,
    help="Show coverage report",
)
@click.option(
    "-k",
    "--filter",
    default=None,
    help="Filter tests by keyword expressions",
)
@click.option("--slow/--no-slow", default=True, help="Include the long acceptance runs")
def test(coverage, filter, slow):
    """Run the tests."""
    args = ["pytest", TEST_PATH, "--verbose"]
    if coverage:
        args.append("--cov=tensorsynth")
        args.append("--cov-branch")
        args.append("--cov-report=xml")
        args.append("--cov-report=html")
        args.append("--cov-report=term")
    if filter:
        args.extend(["-k", filter])
    if not slow:
        args.extend(["-m", "not slow"])
    rv = call(args)
    exit(rv)


@cli.command()
@click.option(
    "-c",
    "--check",
    default=False,
    is_flag=True,
    help="Don't make any changes to files, just confirm they are formatted correctly",
)
def lint(check):
    """Lint and check code style with black, flake8 and isort."""
    skip = [
        "requirements",
        "htmlcov",
        "models",
        "__pycache__",
    ]
    root_files = glob("*.py")
    root_directories = [name for name in next(os.walk("."))[1] if not name.startswith(".")]
    files_and_directories = [arg for arg in root_files + root_directories if arg not in skip]

    def execute_tool(description, *args):
        """Execute a checking tool with its arguments."""
        command_line = list(args) + files_and_directories
        click.echo(f"{description}: {' '.join(command_line)}")
        rv = call(command_line)
        if rv != 0:
            exit(rv)

    isort_args = []
    black_args = []
    if check:
        isort_args.append("--check")
        black_args.append("--check")
    execute_tool("Fixing import order", "isort", *isort_args)
    execute_tool("Formatting style", "black", *black_args)
    execute_tool("Checking code style", "flake8")
