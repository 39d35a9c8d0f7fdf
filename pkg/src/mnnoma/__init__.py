"""Interference and rate analysis for two-user uplink multinumerology NOMA."""
from .channel import EPA, EVA, TapProfile, cfr, draw_realization, load_profile, toeplitz_matrix
from .ini import (IniMatrix, MseVector, frame_mse, ini_ordering1, ini_ordering2,
                  ini_ordering2_all, mse_vector)
from .numerology import Numerology, NumerologyPair, make_pair, numerology_from_index, pair_from_indices
from .rates import (PowerSplit, RateReport, baseline_rates, exhaustive_power_search, noma_state,
                    optimize_split)

__version__ = "0.1.0"
