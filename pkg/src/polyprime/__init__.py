"""Primes of the form mu*T(r,m) + nu*T(s,n): symbolic density regimes and empirical checks."""
from .analysis import (APReport, APRow, CountTable, FitResult, OQTable, admissible_ap, ap_report,
                       count_checkpoints, fit_exponent, oq_explore)
from .errors import CorruptCache, FitError, InvalidArgument, PolyPrimeError, ResourceError
from .polygonal import inverse_polygonal, polygonal_number, polygonal_sequence
from .quadform import (CaseReport, CombinationReport, CombinationSpec, ParityCase, QuadraticForm,
                       Regime, alpha_beta, classify_combination, classify_regime, closed_form_D,
                       content, content_closed_form, discriminant, invariant_D,
                       irreducible_over_Z, parity_polynomial, partials_independent,
                       represents_odd_values)
from .representability import (ReprConfig, corollary3_predicate, enumerate_combination_values,
                               enumerate_form_values, representable_primes, sum_of_two_squares,
                               sum_of_two_triangulars)
from .sieve import BitSet, build_sieve, load_cache, prime_count, primes_in_progression, save_cache

__version__ = "0.1.0"
