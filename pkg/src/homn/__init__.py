"""Hong-Ou-Mandel optical neuron: coincidence-rate binary image classifier.

A single-photon input field interferes with a trainable probe field on a
50:50 beam splitter; the two-photon coincidence rate encodes the squared
overlap between them, which a sigmoid plus bias turns into a binary
prediction. The package covers dataset preparation, spatial and Fourier
encodings, exact and all-optical gradients, full-batch training, classical
baseline neurons, and photon-budget accounting.
"""

from .baseline import (
    ClassicalParams,
    classical_forward,
    evaluate_classical,
    fit_classical,
    quantum_analog_forward,
)
from .dataset_io import (
    BinaryDataset,
    LabeledSet,
    Source,
    filter_binary,
    load_cifar10,
    load_mnist,
    make_synthetic,
    pad_to,
    parse_cifar10,
    parse_idx,
    to_grayscale,
)
from .errors import (
    DegenerateProbeError,
    EmptyClassError,
    FormatError,
    HomnError,
    InvalidOverlapError,
    ShapeError,
    TruncationError,
    ZeroFieldError,
)
from .field_encoding import (
    Domain,
    Field,
    FieldDataset,
    cell_overlap,
    dft2_unitary,
    encode_dataset,
    idft2_unitary,
    normalize_field,
)
from .neuron import (
    NeuronConfig,
    ProbeParams,
    coincidence_probability,
    grad_f_approx,
    grad_f_exact,
    overlap_f,
    predict,
    probe_field,
)
from .photon_budget import (
    ImagingCostModel,
    ShotNoiseReport,
    classification_photons_classical,
    classification_uncertainty_quantum,
    imaging_photons_classical,
    sample_coincidences,
    scaling_report,
)
from .trainer import (
    GradientMode,
    InitScheme,
    TrainConfig,
    TrainHistory,
    bce,
    evaluate,
    fit,
    loss_chain,
    train_epoch,
)

__version__ = "0.1.0"
