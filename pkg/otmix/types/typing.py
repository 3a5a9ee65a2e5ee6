import numpy as np
from typing import *

ArrayLike = Union[np.ndarray, Sequence[Sequence[float]], Sequence[float]]
del np
