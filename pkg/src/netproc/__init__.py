"""netproc: configuration procedures for network devices from model differences."""

from importlib import resources
from pathlib import Path

from .diff import Label, LabeledModel, PairingResult, diff_report, label_models, pair_groups
from .errors import (ChainCycleError, GenerationError, NetprocError, PairingError, ParseError,
                     TemplateError, ValidationError)
from .generator import (CommandInstance, CommandTree, Procedure, apply_row, emit, emit_trace,
                        generate_all, generate_for_config, inject_mode_wrappers,
                        prune_redundant_modals)
from .metamodel import (Metamodel, RelationshipDecl, SpecItem, SpecItemGroup, dump_metamodel,
                        effective_items, effective_relationships, load_metamodel)
from .model import (GroupValue, Model, RelationshipValue, Violation, config_roots, load_model,
                    traversal, validate_conformance)
from .template import (Condition, Template, TemplateRow, eval_condition, expand_spec_items,
                       load_template, load_template_dir, select_template)

__version__ = "0.1.0"


def bundled(*parts: str) -> Path:
    """Path to a bundled asset, e.g. ``bundled("scenario", "asis.json")``."""
    return Path(str(resources.files(__name__).joinpath("data", *parts)))


def load_bundled():
    """The bundled metamodel, scenario models and template library."""
    mm = load_metamodel(bundled("metamodel.json").read_text(encoding="utf-8"))
    asis = load_model(bundled("scenario", "asis.json").read_text(encoding="utf-8"), mm)
    tobe = load_model(bundled("scenario", "tobe.json").read_text(encoding="utf-8"), mm)
    return mm, asis, tobe, load_template_dir(bundled("templates"))
