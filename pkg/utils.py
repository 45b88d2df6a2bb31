import json
import logging
import os
from pathlib import Path
from typing import Optional

# environment variable naming the default parent of run directories
OUTPUT_ROOT_VARIABLE = 'HARTREE_OUTPUT_ROOT'


def configure_logging(verbose: bool = False):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def default_output_root() -> Path:
    return Path(os.environ.get(OUTPUT_ROOT_VARIABLE, '.'))


def resolve_output_dir(explicit: Optional[str], configured: Optional[str], run_name: str) -> Path:
    # command line beats configuration beats the environment
    if explicit:
        return Path(explicit)
    if configured:
        return Path(configured)
    return default_output_root() / run_name


def status_line(status: str, exit_code: int, **fields) -> str:
    return json.dumps({'status': status, 'exit_code': int(exit_code), **fields}, sort_keys=True)
