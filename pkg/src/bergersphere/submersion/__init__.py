"""Riemannian submersions from S^3_eps: integrability relations, the
identity chain and the elimination certificate."""
from .certificate import CaseExclusionReport, Certificate, CertificateFailure, case_exclusions, eliminate_and_bound
from .chain import ChainStep, IdentityReport, identity_chain
from .integrability import (AdaptedState, FrameCoefficients, IntegrabilityData, MissingOracleError,
                            adapted_relations_residuals, base_gauss_curvature, curvature_residuals, hopf_data,
                            jacobi_residuals, laplacian, submersion_bitension)
