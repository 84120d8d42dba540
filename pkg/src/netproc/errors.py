"""Exception hierarchy shared by every netproc module."""


class NetprocError(Exception):
    """Base class for all errors raised by netproc."""


class ParseError(NetprocError):
    """An input document could not be parsed at all."""


class ValidationError(NetprocError):
    """A parsed document breaks a structural rule (duplicate name, bad reference...)."""


class ChainCycleError(NetprocError):
    """Self-referencing group values (e.g. an ACL chain) loop back on themselves."""


class PairingError(NetprocError):
    """The same identifier names group values of different groups in AsIs and ToBe."""


class TemplateError(NetprocError):
    """A command template is malformed or cannot be selected."""


class GenerationError(NetprocError):
    """Procedure generation hit an unresolvable state."""
