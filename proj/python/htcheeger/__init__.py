"""Numerical checks of variance and concentration bounds for heavy-tailed product measures."""

from ._core import (
    C1,
    C2,
    C3,
    DomainError,
    Measure,
    NumericalError,
    __version__,
    constants_table,
    eigenvalues,
    estimate,
    grid_bruteforce,
    half_line_scan,
    measure,
    pareto_C_lambda,
    pareto_cheeger_bound,
    ramp_moments,
    run_cli,
    scaling_fit,
    tightness_report,
    verify_pareto,
    verify_tails,
)


def pareto(lambda_=5.0):
    return measure("pareto", lambda_=lambda_)


def laplace(t=1.0):
    return measure("laplace", t=t)


def cli(*args):
    """Run the command-line front end; returns (exit_code, stdout, stderr)."""
    return run_cli([str(a) for a in args])


__all__ = [
    "C1",
    "C2",
    "C3",
    "DomainError",
    "Measure",
    "NumericalError",
    "cli",
    "constants_table",
    "eigenvalues",
    "estimate",
    "grid_bruteforce",
    "half_line_scan",
    "laplace",
    "measure",
    "pareto",
    "pareto_C_lambda",
    "pareto_cheeger_bound",
    "ramp_moments",
    "run_cli",
    "scaling_fit",
    "tightness_report",
    "verify_pareto",
    "verify_tails",
]
