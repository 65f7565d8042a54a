"""qapn: search and analysis toolkit for quadratic APN functions."""

from .boolfun import (
    Vbf,
    algebraic_degree,
    component_walsh_spectrum,
    differential_spectrum,
    extended_walsh_spectrum,
    format_lut_text,
    format_spectrum,
    is_apn,
    linearity,
    read_lut_file,
    write_lut_file,
)
from .catalog import Catalog, CatalogError
from .classes import (
    CanonicalClass,
    canonical_classes,
    class_of_pair,
    exclusion_reason,
    filter_admissible,
    fix_sizes,
)
from .equiv import (
    Fingerprint,
    fingerprint,
    inequivalent,
    ortho_derivative,
    random_ea_transform,
)
from .field import (
    Field,
    lut_to_univariate,
    parse_field_decl,
    parse_polynomial,
    univariate_to_lut,
)
from .lesearch import (
    SeedLibrary,
    build_orbit_plan,
    deterministic_search,
    le_search,
    load_seed_library,
    search_class,
)
from .published import REFERENCE_FUNCTIONS, run_checks
from .search import SearchState, SearchTimeout, enumerate_all, search
from .switching import solve_switchings, switch_sweep

__version__ = "0.1.0"

__all__ = [
    "Vbf", "algebraic_degree", "component_walsh_spectrum",
    "differential_spectrum", "extended_walsh_spectrum", "format_lut_text",
    "format_spectrum", "is_apn", "linearity", "read_lut_file",
    "write_lut_file",
    "Catalog", "CatalogError",
    "CanonicalClass", "canonical_classes", "class_of_pair",
    "exclusion_reason", "filter_admissible", "fix_sizes",
    "Fingerprint", "fingerprint", "inequivalent", "ortho_derivative",
    "random_ea_transform",
    "Field", "lut_to_univariate", "parse_field_decl", "parse_polynomial",
    "univariate_to_lut",
    "SeedLibrary", "build_orbit_plan", "deterministic_search", "le_search",
    "load_seed_library", "search_class",
    "REFERENCE_FUNCTIONS", "run_checks",
    "SearchState", "SearchTimeout", "enumerate_all", "search",
    "solve_switchings", "switch_sweep",
]
