"""Quasi-cocycle extension toolkit for free products of base factors."""

from .factors import ConfigError, FactorSpec, cyclic, finite_table, free, free_abelian
from .groups import GroupElement, GroupModel, ModelMismatchError, Syllable
from .models import MODEL_IDS, build_model
