"""
Exception hierarchy shared by all SGT apps
"""


class SGTError(Exception):
    """Base class for every error raised by the SGT apps"""


class BranchAmbiguity(SGTError):
    """Group element too far from the identity for a principal logarithm"""


class InvalidOrder(SGTError):
    """Series truncation order below one"""


class InvalidSize(SGTError):
    """Mesh size outside the supported range"""


class InvalidRef(SGTError):
    """Entity reference that does not exist in the mesh"""


class NotAdjacent(SGTError):
    """Two vertices that no mesh edge joins"""


class DegenerateTet(SGTError):
    """Tetrahedron with affinely dependent vertices"""


class UnknownCase(SGTError):
    """Test field id outside the catalogue"""


class IOFailure(SGTError):
    """Result file could not be written"""
