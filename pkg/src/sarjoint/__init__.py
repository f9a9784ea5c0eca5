"""Strip-map SAR toolkit: simulation, Doppler centroid estimation, omega-k
focusing and fused median + CLAHE speckle reduction / contrast enhancement."""
from ._accel import backend_name

__version__ = "0.1.0"
__all__ = ["backend_name", "__version__"]
