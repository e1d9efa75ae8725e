"""Random gapped single-orbital superconductors for topology cross-checks."""

import numpy as np
import structlog

from src.core.errors import GapClosedError
from src.models.lattice import LatticeModel, bulk_gap
from src.models.pip import square_superconductor

logger = structlog.get_logger()

GAP_GRID = 24


def random_two_band_model(
    rng: np.random.Generator,
    gap_min: float = 0.3,
    max_tries: int = 200,
) -> LatticeModel:
    """
    Nearest-neighbour hopping and pairing with random amplitudes and a random
    relative pairing phase; every site carries two Majoranas.

    Raises:
        GapClosedError: if no sample with bulk gap ≥ gap_min is found
    """
    gap, where = 0.0, (0.0, 0.0)
    for attempt in range(max_tries):
        tx, ty = rng.uniform(0.5, 1.5, size=2)
        mu = rng.uniform(-5.0, 5.0)
        phase = rng.choice([-1.0, 1.0]) * rng.uniform(np.pi / 4, 3 * np.pi / 4)
        pair_x = rng.uniform(0.5, 1.5)
        pair_y = rng.uniform(0.5, 1.5) * np.exp(1j * phase)
        model = square_superconductor(tx, ty, mu, pair_x, pair_y)
        gap, where = bulk_gap(model, GAP_GRID)
        if gap >= gap_min:
            logger.debug("Two-band model sampled", attempt=attempt, gap=gap, mu=mu)
            return model
    raise GapClosedError(gap, where, f"no gapped sample in {max_tries} tries")
