"""Radial model on the unit ball: profiles, measures, distributions and energies."""

from .core import (cap_distribution, dirichlet_solve, energy, energy_poly_closed, energy_solution,
                   energy_via_s, family, is_below, j_energy, j_energy_poly_closed, j_energy_solution,
                   lp_norm, ma_distribution, profile_grid, stieltjes_layercake, subextension,
                   sandwich_margins, subextension_slope, superposition, vol_distribution)
from .measures import (AtomMeasure, ExpDensityMeasure, MAMeasure, RadialMeasure, ScaledMeasure,
                       SumMeasure, TabulatedMeasure, atom, pushforward_distribution)
from .profiles import (CombinationProfile, ExpProfile, IterLogProfile, MaxProfile, PowerProfile,
                       RadialProfile, ScaledProfile, SolvedProfile, SubextendedProfile,
                       TruncatedProfile, ZeroProfile, exhaustion, log_profile, truncation)

__all__ = [name for name in dir() if not name.startswith("_")]
