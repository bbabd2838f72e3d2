"""Number fields: maximal orders, ideals, prime decomposition, composita, principality."""
