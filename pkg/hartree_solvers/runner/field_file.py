"""
Field files: a one-line header naming dimension, resolution and representation, then the sine coefficients in
lexicographic multi-index order, as decimal text or as little-endian float64.
"""

import re
from pathlib import Path
from typing import Union

import numpy as np

from ..greens import PotentialField
from ..spectral import DomainSpec, SpectralField
from ..spectral.errors import FieldValueError
from .errors import ArtifactError

MAGIC = 'HARTREE-FIELD v1'
BINARY_ENCODING = 'f64le'

_HEADER = re.compile(r'^HARTREE-FIELD v1; d=(?P<d>\d+); n=(?P<n>\d+); repr=(?P<repr>[a-z]+)(?:; encoding=(?P<encoding>\w+))?$')
_FIELD_TYPES = {cls.REPR_TAG: cls for cls in (SpectralField, PotentialField)}


def header(field: SpectralField, binary: bool = False) -> str:
    text = f'{MAGIC}; d={field.domain.dimension}; n={field.domain.points}; repr={field.REPR_TAG}'
    return f'{text}; encoding={BINARY_ENCODING}' if binary else text


def save_field(field: SpectralField, path: Union[str, Path], binary: bool = False) -> Path:
    """
    Writes a field file.

    Parameters
    ----------
    field : SpectralField
        Field to store; PotentialField instances are tagged repr=potential.
    path : Union[str, Path]
        Target file.
    binary : bool, default=False
        Store the coefficients as raw little-endian float64 after the header line.

    Raises
    ------
    ArtifactError
        When the file cannot be written.

    Returns
    -------
    Path
        The written path.
    """

    path = Path(path)
    coefficients = field.coefficients.ravel()
    try:
        if binary:
            payload = (header(field, binary=True) + '\n').encode('ascii') + coefficients.astype('<f8').tobytes()
            path.write_bytes(payload)
        else:
            lines = [header(field)] + [repr(float(value)) for value in coefficients]
            path.write_text('\n'.join(lines) + '\n', encoding='ascii')
    except OSError as error:
        raise ArtifactError(f'Cannot write field file {path}: {error}') from error
    return path


def load_field(path: Union[str, Path]) -> SpectralField:
    """
    Reads a field file in either encoding.

    Raises
    ------
    ArtifactError
        When the file is missing, its header is malformed or the coefficient count does not match the header.

    Returns
    -------
    SpectralField
        The stored field, a PotentialField when tagged repr=potential.
    """

    path = Path(path)
    try:
        payload = path.read_bytes()
    except OSError as error:
        raise ArtifactError(f'Cannot read field file {path}: {error}') from error

    first, _, body = payload.partition(b'\n')
    match = _HEADER.match(first.decode('ascii', errors='replace').strip())
    if match is None:
        raise ArtifactError(f'{path} does not start with a {MAGIC} header')
    field_type = _FIELD_TYPES.get(match['repr'])
    if field_type is None:
        raise ArtifactError(f'{path} has the unknown representation {match["repr"]!r}')

    try:
        domain = DomainSpec(int(match['d']), int(match['n']))
        if match['encoding'] == BINARY_ENCODING:
            coefficients = np.frombuffer(body, dtype='<f8')
        elif match['encoding'] is None:
            coefficients = np.array([float(line) for line in body.decode('ascii').split()], dtype=float)
        else:
            raise ArtifactError(f'{path} uses the unknown encoding {match["encoding"]!r}')
        return field_type(domain, coefficients.astype(float))
    except (FieldValueError, ValueError) as error:
        raise ArtifactError(f'{path} holds an invalid field: {error}') from error
