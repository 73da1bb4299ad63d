"""Rank-census distinguishing experiments on reduced-round AES.

The heavy lifting lives in the compiled extension ``aesrank._core``: a
bit-packed GF(2) linear algebra kernel (blocked PLE elimination with
Four-Russians tables), the cipher, the one-hot space embedding, the
sliding-window rank census and the chi-square census statistics.
"""

from ._core import (  # noqa: F401
    AMBIENT_DIM,
    NUM_WINDOWS,
    SET_SIZE,
    WINDOW_ROWS,
    __version__,
    alpha_support,
    census,
    chi2_upper_tail,
    chi_square,
    embedding_info,
    encrypt,
    evenly_spaced_starts,
    expected_census,
    mixing_order,
    rank_gf2m,
    rank_probability,
    rank_rows,
    run_selftest,
    sbar_element,
    sbox_table,
    theory,
)

__all__ = [
    "AMBIENT_DIM",
    "NUM_WINDOWS",
    "SET_SIZE",
    "WINDOW_ROWS",
    "__version__",
    "alpha_support",
    "census",
    "chi2_upper_tail",
    "chi_square",
    "embedding_info",
    "encrypt",
    "evenly_spaced_starts",
    "expected_census",
    "mixing_order",
    "rank_gf2m",
    "rank_probability",
    "rank_rows",
    "run_selftest",
    "sbar_element",
    "sbox_table",
    "theory",
]
