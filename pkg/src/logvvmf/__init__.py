"""Logarithmic vector-valued modular forms of SL2(Z).

Exact construction of the symmetric-power and C(tau) representations,
logarithmic q-expansions, the natural-boundary classifier, and numerical
growth/Bol-identity probes, served over a FastAPI app with a thin CLI client.
"""

from .analysis import (ExponentialPolySum, FlatnessVerdict, GrowthFit,
                       bol_check, dominant_term, exp_sum_flatness,
                       growth_probe, min_imag_threshold, regroup)
from .fixtures import FixtureSeries, fixture_form, gen_cusp_delta, gen_eisenstein
from .linalg import EXACT, FLOAT, Matrix, QI
from .modgroup import (GeneratorWord, UnimodularMatrix, compose, moebius,
                       random_unimodular, word_decompose, word_evaluate)
from .qexp import (LogBlock, PureQSeries, assemble_component, binom_evaluate,
                   holomorphy_check, q_add, q_derivative, q_evaluate, q_mul,
                   q_scale, translation_residual)
from .repspace import (JordanData, Representation, conjugate, find_intertwiner,
                       modified_jordan_T, rep_evaluate, sigma_rep,
                       sym_power_rep, trivial_rep)
from .vvmf import (Classification, PolyVector, VvmfForm, classify_boundary,
                   component_basis, equivalence_transform,
                   functional_equation_residual, make_C, make_binomial_C,
                   slash_poly)

__version__ = "0.1.0"
