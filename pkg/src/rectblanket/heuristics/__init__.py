from .csa import CsaConfig, CsaState, csa_energy, csa_solve
from .fast import FastConfig, benefit, fast_solve
from .split_fit import PERFECT_FIT, SfConfig, fitness, sf_solve

__all__ = ["CsaConfig", "CsaState", "csa_energy", "csa_solve", "FastConfig", "benefit",
           "fast_solve", "PERFECT_FIT", "SfConfig", "fitness", "sf_solve"]
