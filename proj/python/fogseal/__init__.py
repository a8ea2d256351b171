"""Hash-keystream encryption for IoT devices and fog nodes."""

from ._fogseal import (
    BLOCK_SIZE,
    DEFAULT_HASH,
    MAX_PAYLOAD,
    TUPLE_SIZE,
    FogsealError,
    Registry,
    Session,
    bitflip_census,
    decode_tuple,
    deframe_message,
    derive_keystream,
    encode_tuple,
    forgery_trial,
    frame_message,
    hash32,
    hash_names,
    memory_footprint,
    precompute_keystream,
    run_scenario,
)

__all__ = [
    "BLOCK_SIZE",
    "DEFAULT_HASH",
    "MAX_PAYLOAD",
    "TUPLE_SIZE",
    "FogsealError",
    "Registry",
    "Session",
    "bitflip_census",
    "decode_tuple",
    "deframe_message",
    "derive_keystream",
    "encode_tuple",
    "forgery_trial",
    "frame_message",
    "hash32",
    "hash_names",
    "memory_footprint",
    "precompute_keystream",
    "run_scenario",
]
