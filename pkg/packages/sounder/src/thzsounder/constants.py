from typing import Final

from scipy import constants

SPEED_OF_LIGHT: Final[float] = constants.c
SCHEMA_VERSION: Final[int] = 1
CONTAINER_MAGIC: Final[bytes] = b"THZC"
CONTAINER_VERSION: Final[int] = 1
