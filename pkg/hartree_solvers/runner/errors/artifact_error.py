"""
Exception ArtifactError.
"""


class ArtifactError(OSError):
    """
    Exception raises when an artifact is missing, unreadable or not in the expected format.
    """
