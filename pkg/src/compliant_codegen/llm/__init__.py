"""Prompting, generation with replay, candidate selection and probes."""
from .board import APPENDIX_BOARD, BoardGrid, InvalidGrid, render_board
from .client import (
    ChatClient,
    GenerationConfig,
    GenerationUnavailable,
    ReplayCache,
    cache_key,
    completer,
    generate_candidates,
)
from .probes import (
    Formatting,
    InvalidLiteral,
    RegressionConfig,
    SinusoidConfig,
    digit_space_format,
    format_value,
    parse_value,
    regression_probe,
    regression_prompt,
    regression_sweep,
    sinusoid_probe,
    sinusoid_sweep,
)
from .prompts import ALL_HINTS, Hint, PromptBundle, api_doc, assemble_prompt, bundle_for
from .selection import (
    Candidate,
    ErrorCategory,
    Misuse,
    check_candidates,
    classify_failure,
    extract_program,
    has_search_pattern,
    select_best,
)
