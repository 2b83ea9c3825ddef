"""Joint mapping of several CNNs onto one device."""
