"""Universal XX and Hubbard integrable models from projector data."""
from .graded import GradedSpace, GradingError
from .hubbard import HubbardModel, hubbard_zoo
from .xx import ZOO, XXModel

__version__ = "0.1.0"

__all__ = ["GradedSpace", "GradingError", "HubbardModel", "XXModel", "ZOO", "hubbard_zoo", "__version__"]
