"""Integral closures of ideals over prime finite fields by the Qth-power
algorithm, with non-homogeneous Rees presentations."""

__version__ = "0.1.0"
