"""CNN description parsing, validation and shape inference."""
