"""Shared randomized-scenario builders for the test suite."""

import numpy as np

from preisach_remnant import Box, GridWeighting, MemoryInterface, QRegion


def random_grid_field(rng) -> GridWeighting:
    """Sign-indefinite piecewise-constant density on a random box that
    straddles both axes (so the alpha >= 0 >= beta quadrant is hit)."""
    n_alpha = int(rng.integers(2, 7))
    n_beta = int(rng.integers(2, 7))
    box = Box(
        float(rng.uniform(-0.5, -0.05)),
        float(rng.uniform(0.5, 1.5)),
        float(rng.uniform(-1.5, -0.5)),
        float(rng.uniform(0.05, 0.5)),
    )
    values = rng.normal(size=(n_beta, n_alpha))
    grid = GridWeighting(box, values)
    # densities live on the half-plane alpha >= beta: zero every cell that
    # touches the forbidden triangle so the support invariant holds exactly
    for j in range(n_beta):
        for i in range(n_alpha):
            if grid.beta_edges[j + 1] > grid.alpha_edges[i]:
                values[j, i] = 0.0
    return GridWeighting(box, values)


def random_gamma_interface(rng, box: Box) -> MemoryInterface:
    """Random extremum history finishing at input 0, so the curve passes
    through the diagonal origin."""
    iface = MemoryInterface.virgin(box)
    for _ in range(int(rng.integers(0, 6))):
        iface = iface.push_extremum(float(rng.uniform(box.beta_lo, box.alpha_hi)))
    return iface.push_extremum(0.0)


def random_nonneg_q_scenario(rng, floor: float = 0.0):
    """(field, q) with the density nonnegative on every cell touching Q.

    ``floor`` lifts the Q cells so the remnant range cannot degenerate.
    """
    mu = random_grid_field(rng)
    box = mu.support_box
    alpha2 = float(rng.uniform(0.3, box.alpha_hi))
    beta2 = float(rng.uniform(box.beta_lo, -0.3))
    values = mu.values.copy()
    for j in range(mu.n_beta):
        if mu.beta_edges[j + 1] <= beta2 or mu.beta_edges[j] >= 0.0:
            continue
        for i in range(mu.n_alpha):
            if mu.alpha_edges[i + 1] <= 0.0 or mu.alpha_edges[i] >= alpha2:
                continue
            values[j, i] = abs(values[j, i]) + floor
    return GridWeighting(box, values), QRegion(alpha2, beta2)


def random_quadrant_scenario(rng, floor: float = 0.1):
    """(field, q) where Q is the whole alpha >= 0 >= beta quadrant of the
    support box and the density is nonnegative on every cell meeting it."""
    mu = random_grid_field(rng)
    box = mu.support_box
    values = mu.values.copy()
    for j in range(mu.n_beta):
        if mu.beta_edges[j] >= 0.0:
            continue
        for i in range(mu.n_alpha):
            if mu.alpha_edges[i + 1] <= 0.0:
                continue
            if values[j, i] != 0.0:
                values[j, i] = abs(values[j, i]) + floor
    return GridWeighting(box, values), QRegion(box.alpha_hi, box.beta_lo)
