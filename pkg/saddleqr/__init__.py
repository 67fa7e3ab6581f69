"""
Stable QR solvers for symmetric saddle point systems.
"""
from .blockgs import BlockPartition
from .blockgs import BlockQR
from .blockgs import bcgs
from .blockgs import bcgs2
from .errors import SaddleQRError
from .householder import thin_householder_qr
from .saddle import SaddleBlocks
from .saddle import SaddleSolution
from .saddle import assemble
from .saddle import solve
from .saddle import validate
from .stability import StabilityReport
from .stability import backward_certificate
from .stability import metrics

__version__ = '0.1.0'
