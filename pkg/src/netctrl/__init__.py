"""Controllability and observability analysis of heterogeneous networked LTI systems."""

__version__ = "0.1.0"

from .errors import ComputationError, InputError, NetctrlError, ValidationError
from .linalg import (DEFAULT_TOL, Spectrum, SpectrumEntry, TolerancePolicy, cluster_values, eig_left,
                     left_nullspace_basis, nullspace_basis, numerical_rank)
from .network import (NetworkSpec, NodeDynamics, Topology, cycle_topology, homogeneous_spec, path_topology,
                      star_topology, validate, wheel_topology)
from .assembly import AssembledSystem, assemble, coupling_block
from .classical import (Verdict, Witness, controllability_matrix, kalman_controllable, kalman_observable,
                        observability_matrix, pbh_controllable, pbh_observable)
from .theorems import (HypothesisReport, SpectrumCheck, check_hypotheses, nc_no_external, nc_no_incoming,
                       nc_rank_bound, special_topology_controllable, thm1_controllable, thm1_solution_space,
                       thm2_spectrum, thm3_controllable, thm4_observable)
from .specfile import SpecSyntaxError, dump_spec, load_fixture, parse_spec
from .report import AnalysisReport, emit_report, report_from_machine, run_analysis
