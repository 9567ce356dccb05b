"""
Typing definitions for phermit.
"""

import numpy as np

from typing import (TYPE_CHECKING, Any, AnyStr, Callable, Dict,  # isort:skip
                    Iterable, List, Optional, Sequence, Tuple, Union)  # noqa: F401

if TYPE_CHECKING:
    from phermit.algebra.operators import Metric  # noqa: F401

    ArrayType = np.ndarray  # generic definition

    # dense complex square matrix (validated by `phermit.algebra.operators.check_op`)
    OpType = np.ndarray
    # one-dimensional complex amplitude vector
    StateVecType = np.ndarray
    # operator given either directly or through a metric wrapper
    OpOrMetricType = Union[OpType, Metric]
    # time-dependent operator provider, H(t)
    GeneratorType = Union[OpType, Callable[[float], OpType]]
    # real function evaluated on grid nodes
    GridFunctionType = Callable[[ArrayType], ArrayType]

    Number = Union[int, float]
    ComplexNumber = Union[int, float, complex]
    _literalJSON = Optional[Union[AnyStr, Number, bool]]
    JSON = Union[_literalJSON, List[Union[_literalJSON, "JSON"]], Dict[AnyStr, Union[_literalJSON, "JSON"]]]
    ConfigDict = Dict[AnyStr, Union[_literalJSON, JSON]]
