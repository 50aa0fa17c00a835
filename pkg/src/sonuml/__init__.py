"""Sound catalogues, auditory-notation linting, study statistics, and
audio-first navigation for UML class diagrams."""

from .audio import (
    AudioBuffer,
    AuditoryVariables,
    SynthSpec,
    apply_variables,
    mix,
    normalize,
    read_wav,
    synth,
    write_wav,
)
from .catalogue import (
    ConceptBinding,
    EarconRecipe,
    SoundAsset,
    SoundCatalogue,
    builtin_baseline,
    builtin_proposed,
    parse_manifest,
    realize_earcon,
    serialize_manifest,
)
from .principles import LintConfig, PrincipleId, ValidationReport, Violation, validate
from .sonifier import (
    RenderProfile,
    element_cue,
    plan_walkthrough,
    render_timeline,
    spatialize,
)
from .stats import (
    StudyDataset,
    StudyReport,
    chi_square_gof,
    chi_square_p,
    descriptive_stats,
    holm_bonferroni,
    load_responses,
    study_report,
)
from .uml import ClassModel, assign_layout, model_stats, parse_diagram, serialize_diagram

__version__ = "0.1.0"
