"""Generalized Fibonacci/Lucas circulant matrices and matrix-blocking codes."""

from .circulant import (
    GCirculant,
    RatioCirculantParams,
    RightCirculant,
    Spectrum,
    build_F_matrix,
    build_G_matrix,
    build_H_matrix,
    det_bruteforce,
    det_closed_F,
    det_closed_G,
    det_closed_H,
    eigenvalues_closed_F,
    eigenvalues_dft,
    gcirc_from_row,
    rcirc_from_row,
)
from .codec import (
    Algorithm,
    CharTable,
    CodePacket,
    decode,
    deserialize_packet,
    encode,
    serialize_packet,
    verify_packet,
)
from .errors import (
    CorruptPacket,
    DegenerateBlock,
    FallbackUsed,
    InvalidParameters,
    SingularDenominator,
    UnsupportedCharacter,
)
from .polyseq import (
    IntRecurrenceParams,
    Polynomial,
    RecurrenceParams,
    char_roots,
    fibonacci_binet,
    fibonacci_seq,
    lucas_binet,
    lucas_seq,
)

__version__ = "0.1.0"
