"""Bit-exact model of a multi-mode 5G NR (BG1, Z <= 96) offset min-sum LDPC decoder."""

from .basegraph import BaseGraph, CodeConfig, ParityMatrix, code_lengths, expand, load_basegraph, load_bg1
from .channel import ChannelParams, add_noise, llr, modulate, quantize
from .codec import depuncture_llrs, encode, puncture
from .mscore import DecodeParams, DecodeResult, decode, decode_batch, syndrome_ok

__all__ = [
    "BaseGraph", "CodeConfig", "ParityMatrix", "code_lengths", "expand", "load_basegraph", "load_bg1",
    "ChannelParams", "add_noise", "llr", "modulate", "quantize",
    "depuncture_llrs", "encode", "puncture",
    "DecodeParams", "DecodeResult", "decode", "decode_batch", "syndrome_ok",
]
