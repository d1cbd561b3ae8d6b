namespace padoa {}
