from .field_value_error import FieldValueError
from .domain_mismatch_error import DomainMismatchError
from .parameter_error import ParameterError
