from .lp import LpProblem, LpSolution, lp_solve
from .sdp import SdpProblem, SdpSolution, lmi_maximize, sdp_solve
from .linalg import bisect, psd_project
