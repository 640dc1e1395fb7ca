"""EMG-to-hand-kinematics regression: preprocessing, networks, training, evaluation."""

__version__ = "0.1.0"
