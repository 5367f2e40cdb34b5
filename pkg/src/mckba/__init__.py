"""MCKBA chaos-based image cipher and its four-chosen-plaintext break."""
from .attack import (EquivalentKey, chosen_plain_sequences, equivalent_decrypt,
                     recover_equivalent_key, solve_modadd_xor)
from .bitcodec import ElementSeq, elements_to_image, image_to_elements
from .chaos import ControlSeq, generate_states, logistic_step, mu_consistent
from .cipher import (SecretKey, decrypt_elements, decrypt_image, encrypt_elements,
                     encrypt_image, keygen, validate_key)
from .keyrecovery import recover_secret_key

__version__ = "0.1.0"
