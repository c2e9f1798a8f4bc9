"""Verification toolkit for finite processes in a CCS-style calculus."""
from .lts import Action, Lts, Relation, act_of, deadlocks, isomorphic, reachable_part
from .kernels import BACKEND

__version__ = "0.1.0"
