namespace dmdoa {}
