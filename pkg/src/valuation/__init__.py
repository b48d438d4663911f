# Valuation module - Value cipher, hash gate and acceptance criteria
