class LeafgrowError(Exception):
    """Base class for errors raised by leafgrow."""


class AttachmentError(LeafgrowError, ValueError):
    """A batch violates leaf attachment or time ordering."""


class DegenerateEvidenceError(LeafgrowError, ValueError):
    """Likelihood times prior has no mass, so the posterior is undefined."""


class ZeroBranchError(LeafgrowError, ValueError):
    """Every child of a branch point carries zero weight."""


class ConfigError(LeafgrowError, ValueError):
    """A growth configuration value is out of range."""
