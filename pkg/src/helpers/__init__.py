import logging

import numpy as np

from src.constants import TWO_PI


def print_h_bar():
    logging.info("--------------------------------------------------------------------")


def is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n > 0 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    """Smallest power of two >= n"""
    return 1 << max(0, int(n) - 1).bit_length()


def grid_nodes(n: int) -> np.ndarray:
    """Uniform dyadic grid t_j = 2*pi*j/n, j = 0..n-1"""
    return TWO_PI * np.arange(n) / n
