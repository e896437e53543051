"""Command-line harness: run, validate-market, sweep-credit, env-server, preset."""
from __future__ import annotations

import dataclasses
import json
import sys

import click

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import config as config_mod
from . import harness, policies, server

_CONFIG_HELP = "Path to a TOML configuration file."
_SET_HELP = "Override one config key, e.g. --set price.rho=0.95 (repeatable)."
_SEED_HELP = "Master seed; beats the config file, DRSIM_SEED, and --set."


def _parse_override(pair: str) -> tuple[str, object]:
    key, sep, raw = pair.partition("=")
    if not sep or not key:
        raise click.BadParameter(f"--set expects key=value, got {pair!r}")
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw  # bare words pass through as strings
    return key.strip(), value


def _load(config_path, overrides, seed) -> config_mod.SimConfig:
    try:
        parsed = dict(_parse_override(pair) for pair in overrides)
        cfg = config_mod.load_config(config_path, parsed)
        if seed is not None:
            cfg = dataclasses.replace(cfg, seed=seed)
        return cfg
    except config_mod.ConfigError as exc:
        raise click.ClickException(str(exc)) from None


def _common(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help=_CONFIG_HELP)(fn)
    fn = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help=_SET_HELP)(fn)
    fn = click.option("--seed", type=int, default=None, help=_SEED_HELP)(fn)
    return fn


@click.group()
def main() -> None:
    """Demand-response credit market simulator."""


@main.command()
@_common
@click.option("--policy", default="nocredit", show_default=True, help="nocredit | uniform[:level] | rule | budget-rule | random")
@click.option("--episodes", default=1, show_default=True, type=int, help="Number of episodes (seeds seed+0..n-1).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True), default=None, help="Write per-step records (JSONL) here; summary goes to <out>.summary.json.")
def run(config_path, overrides, seed, policy, episodes, out_path):
    """Run episodes under a policy and print the summary JSON."""
    cfg = _load(config_path, overrides, seed)
    try:
        pol = policies.parse_policy(policy, cfg.credit_max)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    summary = harness.run_episodes(cfg, pol, episodes, out_path)
    click.echo(json.dumps(summary, indent=2))


@main.command("validate-market")
@_common
@click.option("--steps", default=4380, show_default=True, type=int, help="Trace length in hours.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True), default=None, help="Also write the report JSON here.")
def validate_market(config_path, overrides, seed, steps, out_path):
    """Simulate prices only and print validation statistics."""
    cfg = _load(config_path, overrides, seed)
    try:
        report = harness.validate_market(cfg, steps)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    text = json.dumps(report.to_dict(), indent=2)
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    click.echo(text)


@main.command("sweep-credit")
@_common
@click.option("--levels", default="0,0.02,0.04,0.06,0.08,0.10", show_default=True, help="Comma-separated credit levels.")
@click.option("--episodes", default=50, show_default=True, type=int, help="Episodes per level (matched seeds).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True), default=None, help="Write the frontier as CSV here.")
def sweep_credit(config_path, overrides, seed, levels, episodes, out_path):
    """Sweep uniform credit levels and print the frontier points."""
    cfg = _load(config_path, overrides, seed)
    try:
        level_values = tuple(float(v) for v in levels.split(","))
    except ValueError:
        raise click.ClickException(f"--levels must be comma-separated numbers, got {levels!r}") from None
    try:
        points = harness.sweep_credit(cfg, level_values, episodes, out_path)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    click.echo(json.dumps([pt.to_dict() for pt in points], indent=2))


@main.command("env-server")
@_common
def env_server(config_path, overrides, seed):
    """Serve the environment over stdin/stdout (one JSON object per line)."""
    cfg = _load(config_path, overrides, seed)
    sys.exit(server.serve(cfg))


@main.command()
@click.argument("name", type=click.Choice(config_mod.PRESET_NAMES))
def preset(name):
    """Print a named preset as a TOML config."""
    click.echo(config_mod.dumps_config(config_mod.preset(name)), nl=False)


if __name__ == "__main__":
    main()
