"""Worst-case uniform errors of Zygmund and Fejer sums on convolution classes."""
from ._kernels import BACKEND
from .errors import DomainError, ParameterError, PrecisionError, QuadratureError, TruncationError
from .extremals import (WitnessResult, all_witnesses, dirichlet_norm, witness_f1, witness_f2,
                        witness_f3, witness_f4)
from .lemmas import LemmaSweepResult, lemma1_sum, lemma1_sweep, lemma2_sup_ratio, lemma2_sweep
from .norms import (ErrorReport, QuadratureConfig, class_error_details, exact_class_error,
                    lp_norm_periodic, parseval_error)
from .trigcore import (DeviationKernel, TrigPolynomial, convolve_class, deviation_kernel_eval,
                       dirichlet_beta, fejer_sum, kernel_tail, zygmund_sum)
from .weights import (ClassSpec, GFunction, RegimeLabel, WeightFunction, classify_regime, eval_psi,
                      parse_weight, predicted_order)

__version__ = "0.1.0"
