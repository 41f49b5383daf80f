"""Built-in model catalog.

Ids:

* ``z_z``    free product of two infinite cyclic factors, generators a, b
* ``z2_z``   free product of a rank-2 lattice (basis x, y) and an
             infinite cyclic factor (generator t)
* ``c2_c2``  free product of two order-2 factors, generators p, q
"""

from . import factors
from .factors import ConfigError
from .groups import GroupModel


def build_model(model_id, relative_generator_mode="none"):
    if model_id == "z_z":
        specs = (factors.free_abelian(1, ["a"]), factors.free_abelian(1, ["b"]))
    elif model_id == "z2_z":
        specs = (factors.free_abelian(2, ["x", "y"]), factors.free_abelian(1, ["t"]))
    elif model_id == "c2_c2":
        specs = (factors.cyclic(2, ["p"]), factors.cyclic(2, ["q"]))
    else:
        raise ConfigError("unknown model id %r" % (model_id,))
    return GroupModel(specs, relative_generator_mode, name=model_id)


MODEL_IDS = ("z_z", "z2_z", "c2_c2")
