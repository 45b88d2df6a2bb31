from .verdict import Verdict
