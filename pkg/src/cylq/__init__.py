"""Exact enumeration, generating functions and identity checks for tight cylindric partitions."""

from .cylinder import CylindricPartition, Profile, enumerate_cylindric, enumerate_tight
from .dhk import DHKPartition, dhk_from_tight, enumerate_dhk, tight_from_dhk
from .series import BivariateSeries

__all__ = [
    "BivariateSeries",
    "CylindricPartition",
    "DHKPartition",
    "Profile",
    "dhk_from_tight",
    "enumerate_cylindric",
    "enumerate_dhk",
    "enumerate_tight",
    "tight_from_dhk",
]
