from .sign import Sign
