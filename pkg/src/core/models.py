from enum import Enum
from typing import Tuple


class Modality(str, Enum):
    """Input modalities a tower can consume."""
    AUDIO = "audio"
    LYRICS = "lyrics"


# Fusion concatenates tower outputs in this order
MODALITY_ORDER: Tuple[Modality, ...] = (Modality.AUDIO, Modality.LYRICS)


class Mode(str, Enum):
    """Forward-pass mode."""
    TRAIN = "train"
    EVAL = "eval"


class Precision(str, Enum):
    DOUBLE = "double"
    SINGLE = "single"

    @property
    def dtype(self) -> str:
        return "float64" if self is Precision.DOUBLE else "float32"


class Split(str, Enum):
    TRAIN = "train"
    VAL = "val"


class MoodCluster(str, Enum):
    """The five mood clusters used as class labels."""
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"

    @property
    def index(self) -> int:
        return _CLUSTER_ORDER.index(self)

    @classmethod
    def from_index(cls, index: int) -> "MoodCluster":
        return _CLUSTER_ORDER[index]

    @property
    def moods(self) -> Tuple[str, ...]:
        return _CLUSTER_MOODS[self]


_CLUSTER_ORDER: Tuple[MoodCluster, ...] = tuple(MoodCluster)

_CLUSTER_MOODS = {
    MoodCluster.I: ("passionate", "rousing", "confident", "boisterous"),
    MoodCluster.II: ("cheerful", "fun", "sweet", "amiable"),
    MoodCluster.III: ("poignant", "wistful", "bittersweet", "autumnal"),
    MoodCluster.IV: ("humorous", "silly", "campy", "quirky", "witty"),
    MoodCluster.V: ("aggressive", "fiery", "intense", "volatile"),
}

N_CLUSTERS = len(_CLUSTER_ORDER)
