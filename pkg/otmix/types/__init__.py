from .typing import *
from .sequence import EmbeddingSequence, MassVector, MixupSequence
from .plan import CostMatrix, TransportPlan, Alignment
from .config import WindowConfig, SolverConfig, MixupConfig, ObjectiveWeights, SynthConfig
