from .configuration_error import ConfigurationError
from .artifact_error import ArtifactError
