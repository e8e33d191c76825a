from . import ablate, evaluate, featurize, inspect_checkpoint, predict, synth, train

# registration order is the order shown by --help
COMMANDS = (featurize, train, evaluate, inspect_checkpoint, predict, synth, ablate)

__all__ = ["COMMANDS"]
