"""
Sections Package

Small sections of nD̄ on P¹_ℤ and the asymptotic experiments built on them.

- space: section spaces, integer sections, sup norms
- counting: ĥ⁰ by enumeration, log-domain bounds, the S_n sub-box
- distortion: distortion functions, growth and Gromov probes
- sigma: σ-decomposition, asymptotic multiplicities, orthogonality probe
"""

from src.sections.space import IntegerSection, SectionSpace, section_space, sup_norm
from src.sections.counting import hhat0_bounds, hhat0_exact, sn_box
from src.sections.distortion import dist_growth_probe, distortion, gromov_probe
from src.sections.sigma import asymptotic_multiplicity, orthogonality_probe, sigma_decomposition

__version__ = "1.0.0"
