"""Many-sorted hybrid first-order logic with rigid symbols."""
