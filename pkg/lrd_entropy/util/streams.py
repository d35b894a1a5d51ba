import numpy as np

from lrd_entropy.exceptions import ValidationError


def make_stream(base_seed: int, *stream_id: int) -> np.random.Generator:
    """
    Counter-based random stream fully determined by (base_seed, stream_id).

    Streams never share state: every call builds a fresh Philox generator
    from a SeedSequence whose spawn key is the stream id, so the same pair
    always yields the same draws no matter which process or thread asks.
    """
    if base_seed < 0:
        raise ValidationError("base_seed must be non-negative")
    if any(i < 0 for i in stream_id):
        raise ValidationError("stream id components must be non-negative")
    seed_sequence = np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=tuple(int(i) for i in stream_id)
    )
    return np.random.Generator(np.random.Philox(seed_sequence))
