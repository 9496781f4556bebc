from .arithmetic import (
    divisor_table,
    dk_table,
    divisors,
    euler_phi,
    mobius,
    mobius_table,
    phi_table,
    ramanujan_sum,
    ramanujan_sum_bruteforce,
    ramanujan_values,
    sigma_minus1,
)
from .eigenform import (
    EIGENFORM_WEIGHTS,
    Eigenform,
    HeckeReport,
    RankinSelbergReport,
    deligne_check,
    eigenform,
    hecke_check,
    rankin_selberg_scan,
)
from .qseries import QSeries, SeriesDivisionError, bernoulli, delta_form, eisenstein, eta_power_series
