"""Analysis package initialization"""

from .constraint_gen import (
    ConstraintGenerator,
    Declaration,
    IdSource,
    ModuleEntry,
    Template,
    generate_file,
)
from .environment import EnvEntry, TypeEnv, current_function, polycontext
from .instantiate import Expander, Instance, expand_instances, expand_template, instantiate, subst_instance

__all__ = [
    'ConstraintGenerator',
    'Declaration',
    'IdSource',
    'ModuleEntry',
    'Template',
    'generate_file',
    'EnvEntry',
    'TypeEnv',
    'current_function',
    'polycontext',
    'Expander',
    'Instance',
    'expand_instances',
    'expand_template',
    'instantiate',
    'subst_instance',
]
